from fastapi import FastAPI
from fastapi.middleware.cors import CORSMiddleware

from src.api.routes import circuits, ensemble, optimize
from src.core.config import get_settings
from src.core.logging import setup_logging

# Initialize FastAPI app
app = FastAPI(
    title="MeasureLess API",
    description="API for MeasureLess, a mid-circuit measurement eliminator for dynamic quantum circuits",
    version="0.1.0",
)

# Configure CORS
app.add_middleware(
    CORSMiddleware,
    allow_origins=["*"],
    allow_credentials=True,
    allow_methods=["*"],
    allow_headers=["*"],
)


@app.on_event("startup")
async def startup_event():
    setup_logging(get_settings().log_level)


# Include routers
app.include_router(circuits.router, prefix="/api/circuits", tags=["Circuits"])
app.include_router(optimize.router, prefix="/api", tags=["Optimize"])
app.include_router(ensemble.router, prefix="/api", tags=["Ensemble"])


@app.get("/api/health", tags=["Health"])
async def health_check():
    """Health check endpoint."""
    return {"status": "ok", "version": app.version}


if __name__ == "__main__":
    import uvicorn
    uvicorn.run("src.api.main:app", host="0.0.0.0", port=8000, reload=True)
