import sys

from zeroflux.cli.main import main

sys.exit(main())
