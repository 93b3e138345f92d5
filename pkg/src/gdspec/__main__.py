import sys

from gdspec.cli import main

sys.exit(main())
