from fibeuler.cli import main
import sys

sys.exit(main())
