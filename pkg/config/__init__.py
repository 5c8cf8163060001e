from config.settings import Settings, log, settings

__all__ = ["Settings", "log", "settings"]
