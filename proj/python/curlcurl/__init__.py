"""Ground states of the singular-potential NLS and curl-curl ansatz fields."""

from curlcurl._core import *  # noqa: F401,F403
from curlcurl._core import __version__  # noqa: F401
