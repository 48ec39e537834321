"""Allow ``python -m gsdo``."""

from gsdo.cli import main

if __name__ == "__main__":
    main()
