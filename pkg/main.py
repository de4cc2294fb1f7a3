#!/usr/bin/env python3
"""
spanfact - spanning factorizations of regular digraphs
and conflict-free universal exchange schedules.

    python main.py build cp --d 3 --D 2
    python main.py --help
"""

from cli import main

if __name__ == "__main__":
    main()
