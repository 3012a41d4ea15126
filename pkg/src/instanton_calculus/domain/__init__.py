"""Domain types: slopes, knot records, exact algebra and graded dimensions."""
