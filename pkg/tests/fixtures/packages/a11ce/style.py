"""Alice's style image generator."""

STYLE_IMAGE = b"\x89PNG\r\n\x1a\nstyle:starry-night"


def image_gen():
    return STYLE_IMAGE
