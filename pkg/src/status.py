"""
Status Console
Tagged status lines ([OK], [INFO], [WARN], [ERROR]) on stderr via rich
"""

from rich.console import Console

from settings import get_settings


console = Console(stderr=True, highlight=False, soft_wrap=True)

_verbose_override = None


def set_verbose(enabled: bool) -> None:
    """Force verbose mode on or off (CLI --verbose)"""
    global _verbose_override
    _verbose_override = enabled


def is_verbose() -> bool:
    if _verbose_override is not None:
        return _verbose_override
    return get_settings().verbose


def banner(title: str) -> None:
    """Print a section banner (verbose only)"""
    if not is_verbose():
        return
    console.print("=" * 80, markup=False)
    console.print(title, markup=False)
    console.print("=" * 80, markup=False)


def ok(message: str) -> None:
    if is_verbose():
        console.print(f"[OK] {message}", markup=False)


def info(message: str) -> None:
    if is_verbose():
        console.print(f"[INFO] {message}", markup=False)


def warn(message: str) -> None:
    console.print(f"[WARN] {message}", markup=False, style="yellow")


def error(message: str) -> None:
    console.print(f"[ERROR] {message}", markup=False, style="red")
