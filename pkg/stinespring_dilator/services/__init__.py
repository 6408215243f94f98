"""Service layer modules (file I/O and report rendering).

The mathematics in ``core`` never touches the filesystem; everything that
reads or writes JSON lives here.
"""

__all__ = [
    "instances",
    "reports",
]
