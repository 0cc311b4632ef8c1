import sys

from eulercert.cli import main

sys.exit(main())
