import sys

from hpdual.cli import main

sys.exit(main())
