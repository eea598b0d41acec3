#!/usr/bin/env python

"""
ColourSeg - main entry point
"""

import sys
from typing import List, Optional

from src.cli import ColourSegCLI


def main(argv: Optional[List[str]] = None) -> int:
    """Main entry point - run the colorseg command line"""
    return ColourSegCLI().run(argv)


if __name__ == "__main__":
    sys.exit(main())
