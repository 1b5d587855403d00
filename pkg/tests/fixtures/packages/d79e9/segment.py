"""Image segmentation stub: tags the image so later stages can see it ran."""


def seg(img):
    return b"SEG:" + img
