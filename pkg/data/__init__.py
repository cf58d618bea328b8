# Report persistence for the Cayley toolkit
