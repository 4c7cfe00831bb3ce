"""Network operads: blueprints for composing networks, and what they mean."""
