"""Configuração de logging a partir de config.py."""

import logging
import sys

import config


def setup_logger(level=None):
    """Configura o logger raiz uma única vez (saída em stderr) e o devolve."""
    root = logging.getLogger()
    level = (level or config.LOG_LEVEL).upper()
    if not any(getattr(h, "_randcorr", False) for h in root.handlers):
        handler = logging.StreamHandler(sys.stderr)
        handler.setFormatter(logging.Formatter(config.LOG_FORMAT))
        handler._randcorr = True
        root.addHandler(handler)
    root.setLevel(level)
    return logging.getLogger(config.APP_NAME)
