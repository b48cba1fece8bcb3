"""flatact: certificates and screening for finite group actions on tori
and closed flat manifolds."""

__version__ = "0.1.0"
