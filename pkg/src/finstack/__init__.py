"""Finite stacky groupoids, weak actions, quotients and bibundles, checked by enumeration."""
