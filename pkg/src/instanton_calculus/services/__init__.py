"""Services implementing the invariant calculus on top of the domain types."""
