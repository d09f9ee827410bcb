"""lishwi - FastAPI application entry point."""

from __future__ import annotations

import logging

from fastapi import FastAPI

from . import __version__
from .api.routes import router as analysis_router
from .config import HOST, LOG_FORMAT, PORT

logging.basicConfig(level=logging.INFO, format=LOG_FORMAT)

app = FastAPI(
    title="lishwi",
    description="Capacity and surface-area utility of Large Intelligent Surfaces under hardware impairments",
    version=__version__,
)

app.include_router(analysis_router)


@app.get("/health")
async def health():
    return {"status": "ok", "version": __version__}


def main():
    """Run the lishwi HTTP server."""
    import uvicorn

    print(f"  Starting lishwi at http://{HOST}:{PORT}/docs")
    print("  Press Ctrl+C to stop\n")
    uvicorn.run("lishwi.app:app", host=HOST, port=PORT, reload=False, log_level="info")


if __name__ == "__main__":
    main()
