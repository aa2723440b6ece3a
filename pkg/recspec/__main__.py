import sys

from recspec.cli.application import main

if __name__ == "__main__":
    sys.exit(main())
