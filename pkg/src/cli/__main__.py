import sys

from src.cli.handler import main

sys.exit(main())
