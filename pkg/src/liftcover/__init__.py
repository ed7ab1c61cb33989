"""liftcover: exact construction and certification of lattice-free bodies,
their lifting regions, and the cutting planes they generate."""

__version__ = "0.1.0"
