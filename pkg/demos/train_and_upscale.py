"""Train a small dual-dictionary model and upscale held-out photos.

This is the full story in one script: degrade a training photo, learn the
main dictionary from (bicubic features, missing detail), learn the residual
dictionary from what layer 1 still misses, then apply both layers to images
the model has never seen. Settings are cut down so the run stays around a
minute; expect modest gains compared with a full 500-atom training.

Run:  python3 demos/train_and_upscale.py [output_dir]
"""

import sys
import time
from pathlib import Path

import numpy as np
from skimage import data

import ddsr

out_dir = Path(sys.argv[1]) if len(sys.argv) > 1 else Path("demo_output")
out_dir.mkdir(parents=True, exist_ok=True)

luma = np.array([0.299, 0.587, 0.114])


def to_gray(arr):
    arr = np.asarray(arr, dtype=np.float64)
    if arr.ndim == 3:
        arr = arr @ luma
    return arr / 255.0


train_img = to_gray(data.astronaut())
cfg = ddsr.ModelConfig(md_atoms=128, rd_atoms=128, ksvd_iterations=10)

print("training on astronaut %s with %d+%d atoms..." % (train_img.shape, cfg.md_atoms, cfg.rd_atoms))
t0 = time.time()
model, report = ddsr.train_model_with_report([train_img], cfg)
print("trained in %.1f s" % (time.time() - t0))
print(
    "  kept %d/%d MD patches, %d/%d RD patches"
    % (
        report.md_samples_kept,
        report.md_samples_total,
        report.rd_samples_kept,
        report.rd_samples_total,
    )
)
print(
    "  training-image fit: bicubic %.2f dB -> layer 1 %.2f dB"
    % (report.psnr_lf[0], report.psnr_tmp[0])
)

model_path = out_dir / "demo.ddsr"
ddsr.save_model(model, model_path)
print("model saved to %s (%d bytes)" % (model_path, model_path.stat().st_size))

print()
print("held-out images:")
names = ["camera", "coins", "coffee"]
images = [to_gray(getattr(data, n)()) for n in names]
bench = ddsr.run_benchmark(model, images, names)
print(bench.format_table())

# write the visual story for the first test image
img = ddsr.crop_to_multiple(images[0], 2)
lr = ddsr.degrade(img, model.config.degradation)
layers = ddsr.super_resolve_layers(lr, model)
ddsr.save_image(ddsr.clamp_to_gray(layers.lf), out_dir / "camera_bicubic.png")
ddsr.save_image(ddsr.clamp_to_gray(layers.tmp), out_dir / "camera_layer1.png")
ddsr.save_image(layers.estimate, out_dir / "camera_dual.png")
ddsr.save_image(ddsr.clamp_to_gray(layers.mhf + 0.5), out_dir / "camera_mhf_plus_half.png")
print("layer images written to %s/" % out_dir)
