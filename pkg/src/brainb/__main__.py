import sys

from brainb.cli import main

sys.exit(main())
