from .frontend.cli import entry_point

entry_point()
