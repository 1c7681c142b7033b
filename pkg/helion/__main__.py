import sys

from helion.main import main

sys.exit(main())
