import sys

from gossipclock.cli import main

sys.exit(main())
