// command-line layer (in progress)
