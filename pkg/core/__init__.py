# Computational modules for the Cayley toolkit
