#!/usr/bin/env python3
"""
randcorr - Momentos de correlações aleatórias
Arquivo principal para execução da linha de comando
"""

import sys

from src.core.app import main

if __name__ == "__main__":
    sys.exit(main())
