"""orbicluster: quantum cluster variables from triangulated orbifolds."""

__version__ = "0.1.0"
