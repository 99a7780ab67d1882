"""Infrastructure layer - logging, cache files and facts files."""
