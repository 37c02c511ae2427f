"""Command-line front end: simulate, ingest, fuse, evaluate, optimize, report."""

from __future__ import annotations

import argparse
import csv
import json
import sys
from collections import Counter
from pathlib import Path

from . import dataset, optimizer, simulator
from .core import CaptureSet, FusionMethod, IlluminationPattern, format_patterns, parse_patterns
from .errors import ConfigError, LumifuseError
from .fusion import fuse
from .pngio import load_png, save_png


def resolve_patterns(text: str) -> list[IlluminationPattern]:
    """A preset name, ``@file`` holding a pattern list, or ``r,g,b;r,g,b;...``."""
    if text in optimizer.PRESETS:
        return list(optimizer.PRESETS[text])
    if text.startswith("@"):
        raw = Path(text[1:]).read_text(encoding="utf-8")
        return parse_patterns(";".join(line for line in raw.replace(";", "\n").splitlines()
                                       if line.strip() and not line.lstrip().startswith("#")))
    return parse_patterns(text)


def _load_scenes(path: Path, seed: int) -> list[tuple[str | None, simulator.SceneSpec]]:
    data = json.loads(path.read_text(encoding="utf-8"))
    if isinstance(data, dict):
        data = data.get("scenes", [data])
    out = []
    for i, entry in enumerate(data):
        entry = dict(entry)
        object_id = entry.pop("object_id", None)
        # scenes without an explicit seed take one derived from --seed
        entry.setdefault("seed", simulator.derive_seed(seed, i))
        out.append((object_id, simulator.SceneSpec.from_dict(entry)))
    return out


def cmd_simulate(args) -> int:
    if args.scenes:
        scenes = _load_scenes(Path(args.scenes), args.seed)
    else:
        scenes = [(None, s) for s in simulator.make_corpus(args.corpus, seed=args.seed)]
    patterns = resolve_patterns(args.patterns)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    for i, (object_id, scene) in enumerate(scenes):
        cs = simulator.simulate_capture_set(scene, patterns, object_id or f"obj{i:03d}-{scene.shape}")
        path = dataset.export_capture_set(cs, out)
        print(f"{cs.object_id}: {len(cs.captures)} patterns -> {path}")
    return 0


def cmd_ingest(args) -> int:
    captures = {dataset.pattern_from_filename(f.name): load_png(f)
                for f in sorted(Path(args.captures).iterdir()) if f.is_file()}
    backgrounds = {}
    for entry in sorted(Path(args.backgrounds).iterdir()):
        if entry.is_dir():
            # a directory of no-contact frames is averaged into one background
            frames = [load_png(f) for f in sorted(entry.iterdir()) if f.suffix.lower() == ".png"]
            backgrounds[dataset.pattern_from_filename(entry.name + ".png")] = dataset.average_backgrounds(frames)
        elif entry.is_file():
            backgrounds[dataset.pattern_from_filename(entry.name)] = load_png(entry)
    cs = CaptureSet(args.object, captures, backgrounds)
    path = dataset.export_capture_set(cs, args.out)
    print(f"{cs.object_id}: {len(captures)} captures, {len(backgrounds)} backgrounds -> {path}")
    return 0


def _fused_pair(args):
    cs = dataset.find_object(args.dataset, args.object)
    patterns = resolve_patterns(args.patterns)
    method = FusionMethod.parse(args.method)
    report = optimizer.evaluate_combination(cs, patterns, method)
    if len(patterns) == 1:
        return cs.captures[patterns[0]], cs.backgrounds[patterns[0]], report
    img = fuse(method, [cs.captures[p] for p in patterns])
    bg = fuse(method, [cs.backgrounds[p] for p in patterns])
    return img, bg, report


def cmd_fuse(args) -> int:
    img, bg, report = _fused_pair(args)
    out = Path(args.out)
    save_png(img, out)
    bg_path = out.with_name(f"{out.stem}_background{out.suffix or '.png'}")
    save_png(bg, bg_path)
    print(json.dumps({"image": str(out), "background": str(bg_path), **report.as_dict()}, indent=2))
    return 0


def cmd_evaluate(args) -> int:
    _, _, report = _fused_pair(args)
    print(json.dumps(report.as_dict(), indent=2))
    return 0


def _summary_path(out: Path) -> Path:
    return out.with_name(f"{out.stem}_summary{out.suffix or '.csv'}")


def cmd_optimize(args, parser) -> int:
    sets = dataset.load_dataset(args.dataset)
    if args.object:
        sets = [cs for cs in sets if cs.object_id in args.object]
    if not sets:
        parser.error(f"no capture sets found under {args.dataset}")
    methods = [FusionMethod.parse(m) for m in args.methods.split(",")]
    out = Path(args.out)
    summary = []

    try:
        if args.mode == "exhaustive":
            rows, per_object = [], []
            for cs in sets:
                patterns = resolve_patterns(args.patterns) if args.patterns else cs.patterns
                cfg = optimizer.SearchConfig(patterns, methods, args.budget, args.metric, args.top_k)
                results = optimizer.exhaustive_search(cs, cfg)
                rows.extend((cs.object_id, r) for r in results)
                if args.metric == "intersection":
                    best = optimizer.intersect_best(optimizer.best_sets(results, methods, args.top_k))
                else:
                    best = {r.key for r in results[:args.top_k]}
                per_object.append(best)
                summary.extend(["object", cs.object_id, args.metric, format_patterns(p), str(m), "", ""]
                               for p, m in sorted(best, key=lambda k: (len(k[0]), k[0], str(k[1]))))
            common = optimizer.intersect_best({str(i): s for i, s in enumerate(per_object)})
            summary.extend(["intersection", "*", args.metric, format_patterns(p), str(m), "", ""]
                           for p, m in sorted(common, key=lambda k: (len(k[0]), k[0], str(k[1]))))
            optimizer.write_search_csv(rows, out)
        else:
            if len(methods) != 1:
                parser.error("greedy mode takes exactly one method")
            metrics = list(optimizer.METRICS) if args.metric == "intersection" else [args.metric]
            rows, prefixes = [], []
            for cs in sets:
                patterns = resolve_patterns(args.patterns) if args.patterns else cs.patterns
                for metric in metrics:
                    seq = optimizer.greedy_sequence(cs, patterns, methods[0], metric, args.budget,
                                                    allow_repeats=args.allow_repeats)
                    rows.append((cs.object_id, seq))
                    best = seq.sequence[:seq.best_n]
                    prefixes.append(frozenset(best))
                    summary.append(["object", cs.object_id, seq.metric, format_patterns(best), str(methods[0]),
                                    seq.best_n, repr(seq.scores[seq.best_n - 1])])
            common = set.intersection(*(set(p) for p in prefixes))
            summary.append(["intersection", "*", args.metric, format_patterns(sorted(common)), str(methods[0]),
                            "", ""])
            counts = Counter(r[5] for r in summary if r[0] == "object")
            print("best_n distribution: " + ", ".join(f"{n}:{c}" for n, c in sorted(counts.items())))
            optimizer.write_sequence_csv(rows, out)
    except ConfigError as exc:
        parser.error(str(exc))

    with open(_summary_path(out), "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh)
        w.writerow(["scope", "object_id", "metric", "patterns", "method", "best_n", "score"])
        w.writerows(summary)
    print(f"wrote {out} and {_summary_path(out)}")
    return 0


def cmd_report(args) -> int:
    import matplotlib
    matplotlib.use("Agg")
    import matplotlib.pyplot as plt

    rows = optimizer.read_csv(args.csv)
    if not rows:
        raise ConfigError(f"{args.csv} has no rows")
    fig, ax = plt.subplots(figsize=(7, 4.5))
    if "step" in rows[0]:
        curves = {}
        for r in rows:
            curves.setdefault((r["object_id"], r["metric"]), []).append((int(r["step"]), float(r["score"])))
        for (obj, metric), pts in sorted(curves.items()):
            steps, scores = zip(*sorted(pts))
            ax.plot(steps, scores, marker=".", label=f"{obj} ({metric})")
            best = max(range(len(scores)), key=lambda i: (scores[i], -i))
            ax.plot(steps[best], scores[best], "o", color=ax.lines[-1].get_color())
        ax.set_xlabel("sequence length n")
        ax.set_ylabel("metric of fused image")
    else:
        metric = {"contrast": "rms_contrast", "background_difference": "background_diff"}.get(args.metric, args.metric)
        by_obj = {}
        for r in rows:
            by_obj.setdefault(r["object_id"], []).append((int(r["rank"]), float(r[metric])))
        for obj, pts in sorted(by_obj.items()):
            ranks, values = zip(*sorted(pts)[:args.top])
            ax.plot(ranks, values, marker=".", label=obj)
        ax.set_xlabel("rank")
        ax.set_ylabel(metric)
    if len(ax.lines) <= 24:
        ax.legend(fontsize=6, ncol=2)
    fig.tight_layout()
    fig.savefig(args.out, format="svg", metadata={"Date": None})
    plt.close(fig)
    print(f"wrote {args.out}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="lumifuse", description=__doc__)
    sub = p.add_subparsers(dest="command", required=True)

    s = sub.add_parser("simulate", help="render synthetic capture sets")
    src = s.add_mutually_exclusive_group(required=True)
    src.add_argument("--scenes", help="JSON file with a list of scene specs")
    src.add_argument("--corpus", type=int, help="generate N seeded scenes instead")
    s.add_argument("--patterns", required=True, help="r,g,b;r,g,b;... | preset | @file")
    s.add_argument("--out", required=True)
    s.add_argument("--seed", type=int, default=0)

    s = sub.add_parser("ingest", help="import PNG captures and background frames")
    s.add_argument("--captures", required=True, help="directory of r<r>_g<g>_b<b>.png captures")
    s.add_argument("--backgrounds", required=True,
                   help="directory of r<r>_g<g>_b<b>.png backgrounds, or of r<r>_g<g>_b<b>/ frame folders to average")
    s.add_argument("--object", required=True)
    s.add_argument("--out", required=True)

    for name, help_ in (("fuse", "fuse captures of one object"), ("evaluate", "print metrics of a fused combination")):
        s = sub.add_parser(name, help=help_)
        s.add_argument("--dataset", required=True)
        s.add_argument("--object", required=True)
        s.add_argument("--patterns", required=True)
        s.add_argument("--method", default="dwt", help="channel-sum | brovey | laplacian[:n] | dwt[:n]")
        if name == "fuse":
            s.add_argument("--out", required=True)

    s = sub.add_parser("optimize", help="exhaustive or greedy illumination search")
    s.add_argument("--dataset", required=True)
    s.add_argument("--mode", choices=("exhaustive", "greedy"), default="exhaustive")
    s.add_argument("--metric", choices=("sharpness", "contrast", "background_diff", "intersection"),
                   default="intersection")
    s.add_argument("--budget", type=int, required=True, help="max subset size / sequence length")
    s.add_argument("--methods", default="dwt", help="comma-separated fusion methods")
    s.add_argument("--patterns", help="restrict candidates (default: every pattern of each object)")
    s.add_argument("--object", action="append", help="restrict to these object ids (repeatable)")
    s.add_argument("--top-k", type=int, default=10)
    s.add_argument("--allow-repeats", action="store_true")
    s.add_argument("--out", required=True)

    s = sub.add_parser("report", help="plot an optimize CSV as SVG")
    s.add_argument("--csv", required=True)
    s.add_argument("--out", required=True)
    s.add_argument("--metric", default="sharpness", help="column to plot for exhaustive CSVs")
    s.add_argument("--top", type=int, default=50)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    handlers = {
        "simulate": cmd_simulate,
        "ingest": cmd_ingest,
        "fuse": cmd_fuse,
        "evaluate": cmd_evaluate,
        "optimize": lambda a: cmd_optimize(a, parser),
        "report": cmd_report,
    }
    try:
        return handlers[args.command](args)
    except (LumifuseError, ValueError, OSError, KeyError) as exc:
        print(f"lumifuse {args.command}: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
