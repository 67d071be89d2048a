import sys

from qmetric.cli import main

sys.exit(main())
