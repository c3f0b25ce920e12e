from typing import Dict, List, Optional, Sequence, Union

from .profile import Profile
from .default_profiles import DEFAULT_PROFILES

ProfileRef = Union[str, Sequence[float], Profile]


class ProfileManager:
    """Manager for profile operations."""

    def __init__(self):
        """Initialize profile manager."""
        self.profiles: Dict[str, Profile] = {}
        self._aliases: Dict[str, str] = {}

    def add_profile(self, profile: Profile) -> None:
        """Add a profile to the manager."""
        if profile.id in self.profiles:
            raise ValueError(f"Profile with ID '{profile.id}' already exists")

        self.profiles[profile.id] = profile
        for alias in profile.aliases:
            self._aliases[_normalise(alias)] = profile.id

    def get_profile(self, profile_id: str) -> Optional[Profile]:
        """Get a profile by ID or alias."""
        key = _normalise(profile_id)
        if key in self.profiles:
            return self.profiles[key]
        return self.profiles.get(self._aliases.get(key, ""))

    def list_profiles(self) -> List[Profile]:
        """List all available profiles."""
        return list(self.profiles.values())

    def load_default_profiles(self) -> None:
        """Load the default profiles."""
        for profile_data in DEFAULT_PROFILES:
            try:
                self.add_profile(Profile.from_dict(profile_data))
            except ValueError:
                # Skip if profile with same ID already exists
                pass

    def create_custom_profile(self, coefficients: Sequence[float]) -> Profile:
        """Create a custom polynomial profile; its norms are taken by sampling."""
        coefficients = [float(c) for c in coefficients]
        profile_id = "custom[" + ",".join(f"{c:g}" for c in coefficients) + "]"
        return Profile(
            id=profile_id,
            name="Custom",
            coefficients=coefficients,
            description="User supplied polynomial in rho/rho_max",
            builtin=False,
        )

    def resolve(self, ref: ProfileRef) -> Profile:
        """Turn a name, alias, coefficient list or Profile into a Profile."""
        if isinstance(ref, Profile):
            return ref
        if isinstance(ref, str):
            profile = self.get_profile(ref)
            if profile is None:
                known = ", ".join(sorted(self.profiles))
                raise ValueError(f"Unknown profile: {ref}. Choose from: {known}, or give coefficients")
            return profile
        return self.create_custom_profile(ref)


def _normalise(name: str) -> str:
    return name.strip().lower().replace(" ", "")
