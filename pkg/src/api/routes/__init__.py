# API routes package