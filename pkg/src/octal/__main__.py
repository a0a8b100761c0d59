import sys

from octal.cli import main

sys.exit(main())
