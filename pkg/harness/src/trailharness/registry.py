"""Architecture and encoder registries.

Canonical names map to segmentation-models-pytorch identifiers; lookups
are forgiving about case, spaces and dashes so CLI usage stays pleasant.
Nothing here imports the model ecosystem.
"""

from __future__ import annotations

ARCHITECTURES: dict[str, str] = {
    "UNet": "unet",
    "FPNet": "fpn",
    "PSPNet": "pspnet",
    "UperNet": "upernet",
    "Segformer": "segformer",
}

# encoder ids follow segmentation-models-pytorch naming; tu- prefixed
# backbones come from its timm bridge
ENCODERS: dict[str, str] = {
    "ConvNeXt-Small": "tu-convnext_small",
    "EfficientViT-B3": "tu-efficientvit_b3",
    "EfficientNet-B7": "efficientnet-b7",
    "MambaOut-Base": "tu-mambaout_base",
    "MobileNetV3-Large": "tu-mobilenetv3_large_100",
    "SAM2-Hiera-Large": "tu-sam2_hiera_large",
    "DenseNet-161": "densenet161",
    "InceptionV4": "inceptionv4",
    "MiT-B5": "mit_b5",
    "MobileOne-S4": "mobileone_s4",
    "ResNet-34": "resnet34",
    "Xception-71": "tu-xception71",
    "VGG16": "vgg16",
    "VGG19": "vgg19",
}


def _fold_name(name: str) -> str:
    return "".join(ch for ch in name.lower() if ch.isalnum())


_ARCH_LOOKUP = {_fold_name(name): name for name in ARCHITECTURES}
_ENC_LOOKUP = {_fold_name(name): name for name in ENCODERS}


def resolve_architecture(name: str) -> tuple[str, str]:
    """Return (canonical name, model id) or raise with the valid choices."""
    canonical = _ARCH_LOOKUP.get(_fold_name(name))
    if canonical is None:
        raise ValueError(
            f"unknown architecture {name!r}; choose from {', '.join(ARCHITECTURES)}"
        )
    return canonical, ARCHITECTURES[canonical]


def resolve_encoder(name: str) -> tuple[str, str]:
    canonical = _ENC_LOOKUP.get(_fold_name(name))
    if canonical is None:
        raise ValueError(f"unknown encoder {name!r}; choose from {', '.join(ENCODERS)}")
    return canonical, ENCODERS[canonical]
