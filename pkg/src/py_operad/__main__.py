# -*- coding: utf-8 -*-
"""python -m py_operad"""

from .cli import main

if __name__ == "__main__":
    main()
