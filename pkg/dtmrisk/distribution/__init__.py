"""Location-scale elliptical distributions and truncation windows."""
