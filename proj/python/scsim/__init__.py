"""Python bindings for the smartcard middleware simulator core.

The compiled extension exposes the APDU codec, the BER-TLV and access-rule
codecs, the access control enforcer, the virtual secure element and the wire
framing. The daemon, CLI and plugin host live in the native binaries.
"""

from ._scsim import *  # noqa: F401,F403
from ._scsim import Error  # noqa: F401
