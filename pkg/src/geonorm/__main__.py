"""
    Entry point of the ``geonorm`` command (also ``python -m geonorm``).
"""

import logging
from logging import NullHandler

from geonorm.cli import geonorm

# Set default logging handler to avoid \"No handler found\" warnings.
logging.getLogger(__name__).addHandler(NullHandler())

def main():
    geonorm()

if __name__ == '__main__':
    main()
