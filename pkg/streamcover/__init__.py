"""Multi-pass streaming set cover with semantic space accounting."""
