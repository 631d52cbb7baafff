"""
qverify Version Information
"""

__version__ = "0.4.0"
__author__ = "Ozy311"
__description__ = "Exact and numeric verification of mock theta and Appell function identities"
__license__ = "MIT"

VERSION_INFO = {
    'name': 'qverify',
    'version': __version__,
    'author': __author__,
    'description': __description__,
    'license': __license__
}


def get_version_string():
    """Get formatted version string."""
    return f"qverify v{__version__} by {__author__}"
