# This file is part of nlcm
# See file LICENSE.txt for license information.

# python -m nlcm

import sys

from nlcm.cli import main

if __name__ == "__main__":
    sys.exit(main())
