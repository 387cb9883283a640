from __future__ import absolute_import, division, unicode_literals

import sys

def main():
    from multipass.cli import main as _main

    # Main entry point (see setup.py)
    sys.exit(_main(sys.argv[1:]))

if __name__ == "__main__":
    main()
