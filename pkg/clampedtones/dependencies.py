import dataclasses
import importlib.metadata
import platform
import sys
from typing import Optional

# Optional packages are listed even when missing so that bug reports show what was not installed.
PACKAGES = {
    'Frontend': ['clampedtones', 'argcomplete', 'rich', 'rich-argparse'],
    'Numerical Stack': ['clampedtonescore', 'numpy', 'scipy', 'mpmath'],
}


@dataclasses.dataclass
class VersionInformation:
    name: str = ''
    version: str = ''
    summary: str = ''
    license_short: str = ''


def gather_version_information(name: str) -> Optional[VersionInformation]:
    try:
        distribution = importlib.metadata.distribution(name)
    except importlib.metadata.PackageNotFoundError:
        return None

    metadata = distribution.metadata
    return VersionInformation(
        name=metadata.get('Name', name),
        version=str(distribution.version),
        summary=metadata.get('Summary', '') or '',
        license_short=metadata.get('License-Expression', '') or metadata.get('License', '') or '',
    )


def gather_versions() -> dict[str, list[tuple[str, Optional[VersionInformation]]]]:
    versions = {
        label: [(name, gather_version_information(name)) for name in names] for label, names in PACKAGES.items()
    }
    system = VersionInformation(name=sys.implementation.name, version=platform.python_version())
    versions['System Software'] = [(system.name, system)]
    return versions


def print_versions() -> None:
    for label, versions in gather_versions().items():
        print(f"\n{label}:\n")
        for name, information in versions:
            print(f"{name} {information.version if information else 'not installed'}")
