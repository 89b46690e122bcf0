import logging
from typing import Dict, Iterator, List, Optional, Tuple

from src.PSICM.certify.base import BoundSpec

# Configure logger
logger = logging.getLogger(__name__)


class BoundRegistry:
    """
    Singleton registry of the bound catalog.

    Collection modules register one instance per inequality on import; the
    verifier and the command line read the catalog back from here.

    Attributes:
        bounds: Dictionary mapping bound names to bound instances.
        _initialized: Flag indicating whether the registry has been initialized.

    Example:
        >>> registry = BoundRegistry()
        >>> registry.register(LogMinusDigammaReciprocal())
        >>> registry.get_bound("log_minus_digamma_reciprocal")
    """

    _instance: Optional["BoundRegistry"] = None
    _initialized: bool = False

    def __new__(cls) -> "BoundRegistry":
        """
        Create or return the singleton instance.

        Returns:
            Singleton BoundRegistry instance.
        """
        if cls._instance is None:
            cls._instance = super(BoundRegistry, cls).__new__(cls)
            cls._instance.bounds = {}
            cls._instance._initialized = False
        return cls._instance

    def __init__(self) -> None:
        if not self._initialized:
            self.bounds: Dict[str, BoundSpec] = {}
            self._initialized: bool = True
            logger.info("BoundRegistry initialized")

    def register(self, bound: BoundSpec, overwrite: bool = False) -> bool:
        """
        Register a bound with the registry.

        Args:
            bound: The bound instance to register.
            overwrite: Whether to replace an existing bound with the same name.

        Returns:
            True if registration was successful.

        Raises:
            TypeError: If the provided object is not a BoundSpec instance.
            ValueError: If the name is already registered and overwrite is False.
        """
        if not isinstance(bound, BoundSpec):
            error_msg: str = f"Can only register BoundSpec instances, got {type(bound)}"
            logger.error(error_msg)
            raise TypeError(error_msg)

        bound_name: str = bound.name

        if bound_name in self.bounds and not overwrite:
            error_msg = f"Bound '{bound_name}' already registered. Use overwrite=True to replace."
            logger.warning(error_msg)
            raise ValueError(error_msg)

        if bound_name in self.bounds:
            logger.warning(f"Overwriting previously registered bound: '{bound_name}'")

        self.bounds[bound_name] = bound
        logger.debug(f"Registered bound: '{bound_name}' - {bound.description}")
        return True

    def unregister(self, bound_name: str) -> bool:
        """
        Remove a bound from the registry.

        Returns:
            True if the bound was found and removed, False otherwise.
        """
        if bound_name in self.bounds:
            del self.bounds[bound_name]
            logger.info(f"Unregistered bound: '{bound_name}'")
            return True
        logger.warning(f"Attempted to unregister non-existent bound: '{bound_name}'")
        return False

    def get_bound(self, bound_name: str) -> Optional[BoundSpec]:
        """Retrieve a bound by name, or None."""
        return self.bounds.get(bound_name)

    def get_bound_names(self) -> List[str]:
        """
        Get names of all registered bounds.

        Returns:
            Sorted list of bound names.
        """
        return sorted(self.bounds.keys())

    def get_bounds(self, core_only: bool = False) -> List[BoundSpec]:
        """Registered bounds sorted by name, optionally only the primary catalog."""
        return [
            self.bounds[name]
            for name in self.get_bound_names()
            if not core_only or self.bounds[name].core
        ]

    def bound_exists(self, bound_name: str) -> bool:
        return bound_name in self.bounds

    def clear_registry(self) -> None:
        """
        Remove all bounds from the registry.

        Useful for testing.
        """
        bound_count: int = len(self.bounds)
        self.bounds.clear()
        logger.info(f"Cleared registry, removed {bound_count} bounds")

    def __iter__(self) -> Iterator[Tuple[str, BoundSpec]]:
        return iter(sorted(self.bounds.items()))

    def __contains__(self, bound_name: str) -> bool:
        return bound_name in self.bounds

    def __len__(self) -> int:
        return len(self.bounds)

    def __str__(self) -> str:
        """String representation of the registry."""
        return f"BoundRegistry(bounds={len(self.bounds)})"

    def __repr__(self) -> str:
        """Detailed representation of the registry."""
        return f"BoundRegistry(bounds={self.get_bound_names()})"


# Global registry instance
registry: BoundRegistry = BoundRegistry()


def get_registry() -> BoundRegistry:
    """
    Get the global bound registry instance.

    Returns:
        Global BoundRegistry singleton instance.
    """
    return registry


def register_bound(bound: BoundSpec, overwrite: bool = False) -> bool:
    """Convenience function to register a bound with the global registry."""
    return registry.register(bound, overwrite)
