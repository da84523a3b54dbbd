"""Symbol-level schedule simulation with exact linear-decodability checks."""
