"""Arbitrary-precision golden-value generator for the localization library.

Build- and test-time tool only: emits a JSON fixture pack that the primary
package verifies against its own double-precision evaluations.
"""

from .generate import GENERATOR_VERSION, build_pack, write_pack

__all__ = ["GENERATOR_VERSION", "build_pack", "write_pack"]
