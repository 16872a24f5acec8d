"""Entry point for python -m synthbench."""

from .cli import main

if __name__ == "__main__":
    main()
