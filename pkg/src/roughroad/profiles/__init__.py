from .profile import Profile, BoundProfile
from .profile_manager import ProfileManager
from .default_profiles import DEFAULT_PROFILES, FOLLOW_PSI


def get_default_profile_manager() -> ProfileManager:
    """Get a profile manager pre-loaded with default profiles."""
    manager = ProfileManager()
    manager.load_default_profiles()
    return manager
