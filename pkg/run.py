#!/usr/bin/env python3
"""
Casimir magnetic interaction calculator launcher
"""
import sys

from casimag.main import main

if __name__ == "__main__":
    sys.exit(main())
