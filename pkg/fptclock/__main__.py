import sys

from fptclock.cli.fpt import main

sys.exit(main())
