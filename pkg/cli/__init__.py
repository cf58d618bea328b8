# Command-line subcommand modules for the Cayley toolkit
