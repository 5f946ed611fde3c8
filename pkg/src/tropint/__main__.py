import sys

from tropint.cli import main

sys.exit(main())
