from dataclasses import dataclass
from typing import Optional


@dataclass(frozen=True)
class CaptchaChallenge:
    challenge_id: str
    # the rendered answer, shown to the person in front of the device
    text: str
    issued_at: int


@dataclass(frozen=True)
class Session:
    """Read-only copy of an auth session handed out of the auth store."""
    session_id: str
    device_id: str
    state: str
    activated_at: int
    pending_captcha: Optional[CaptchaChallenge] = None
    pending_image_index: Optional[int] = None
