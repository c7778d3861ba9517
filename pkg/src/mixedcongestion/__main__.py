import sys

from mixedcongestion.cli import main

sys.exit(main())
