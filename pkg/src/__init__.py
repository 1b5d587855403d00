"""zooc: compose typed services from shareable code packages and publish them."""

__version__ = "0.1.0"
