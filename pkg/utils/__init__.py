# Utility modules for the Cayley toolkit
