"""Static data: seed knot database and the inference rule registry."""
