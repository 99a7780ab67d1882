"""Domain layer - series, arithmetic and the decision engine."""
