"""recspec package."""
