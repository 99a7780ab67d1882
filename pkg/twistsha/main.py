"""Main application - command-line entry point."""

from twistsha.api.cli import app


def main() -> None:
    """Runs the twistsha CLI."""
    app()


if __name__ == "__main__":
    main()
