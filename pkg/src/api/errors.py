from fastapi import HTTPException, status

from src.core.exceptions import CircuitValidationError, MeasureLessError, ResourceLimitError


def http_error(error: MeasureLessError) -> HTTPException:
    """Translate a library error into the HTTP error returned to the client."""
    if isinstance(error, CircuitValidationError):
        return HTTPException(
            status_code=status.HTTP_422_UNPROCESSABLE_ENTITY,
            detail=[str(v) for v in error.violations],
        )
    if isinstance(error, ResourceLimitError):
        return HTTPException(status_code=status.HTTP_413_REQUEST_ENTITY_TOO_LARGE, detail=str(error))
    return HTTPException(status_code=status.HTTP_400_BAD_REQUEST, detail=str(error))
