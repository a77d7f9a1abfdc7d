from .app import app, create_app, execute

__all__ = ["app", "create_app", "execute"]
