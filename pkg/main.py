# main.py
import sys
from naidem.cli import main as run_cli   # subcommands: analyze, solve, catalog, extremal

if __name__ == "__main__":
    sys.exit(run_cli())
