from numera.cli import entry

entry()
