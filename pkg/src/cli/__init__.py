# Command-line package