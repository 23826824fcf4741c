import sys

from symboleo_kit.cli import main

sys.exit(main())
