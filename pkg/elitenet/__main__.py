import sys

from elitenet.cli.main import main

sys.exit(main())
