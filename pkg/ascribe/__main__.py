import sys

from ascribe._src.cli import main

sys.exit(main())
