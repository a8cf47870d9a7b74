"""Command-line surface: check, sync, render, extract, gen-code and gen.

Exit codes:
  0  success / no error findings
  1  error findings (check), or synchronization did not converge (sync)
  2  parse error in an input artifact (message carries the location)
  3  I/O or configuration error
  4  transport or extraction failure (gen)

JSON reports follow REPORT_JSON_SCHEMA and are byte-identical for
identical invocations.
"""

from __future__ import annotations

import argparse
import hashlib
import json
import sys
from pathlib import Path

from .config import Config, load_config
from .consistency import (InputDescriptor, MatchOptions, Report, check,
                          fingerprint_text)
from .correction import (CorrectionEdit, CorrectionSet, Policy, apply,
                         propose, resolve)
from .errors import (ConfigError, GenerationUnparsableError, ModelSyncError,
                     NoBlockFoundError, ParseError, TransportError)
from .llm import FixtureTransport, HttpTransport, gen_code as llm_gen_code, \
    gen_model as llm_gen_model
from .model import ClassModel, make_type_table
from .plantuml import parse_plantuml, render_plantuml
from .pycode import CodeDocument, parse_code, render_code_skeleton

REPORT_JSON_SCHEMA = {
    "$schema": "http://json-schema.org/draft-07/schema#",
    "type": "object",
    "required": ["version", "inputs", "options", "findings"],
    "additionalProperties": False,
    "properties": {
        "version": {"const": 1},
        "inputs": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["path", "sha256"],
                "additionalProperties": False,
                "properties": {"path": {"type": "string"},
                               "sha256": {"type": "string"}},
            },
        },
        "options": {
            "type": "object",
            "required": ["nameMode", "renameThreshold",
                         "inferCodeRelationships", "typeEquivalences"],
            "additionalProperties": False,
            "properties": {
                "nameMode": {"enum": ["exact", "canonical"]},
                "renameThreshold": {"type": "number"},
                "inferCodeRelationships": {"type": "boolean"},
                "typeEquivalences": {
                    "type": "array",
                    "items": {"type": "array",
                              "items": {"type": "string"}},
                },
            },
        },
        "findings": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["id", "kind", "severity", "modelLocation",
                             "codeLocation", "detail", "suggestions"],
                "additionalProperties": False,
                "properties": {
                    "id": {"type": "string"},
                    "kind": {"type": "string"},
                    "severity": {"enum": ["error", "advisory"]},
                    "modelLocation": {"$ref": "#/definitions/location"},
                    "codeLocation": {"$ref": "#/definitions/location"},
                    "detail": {"type": "string"},
                    "suggestions": {
                        "type": "array",
                        "items": {
                            "type": "object",
                            "required": ["side", "editKind", "description"],
                            "additionalProperties": False,
                            "properties": {
                                "side": {"enum": ["model", "code"]},
                                "editKind": {"type": "string"},
                                "description": {"type": "string"},
                            },
                        },
                    },
                },
            },
        },
    },
    "definitions": {
        "location": {
            "oneOf": [
                {"type": "null"},
                {
                    "type": "object",
                    "required": ["class"],
                    "additionalProperties": False,
                    "properties": {
                        "class": {"type": "string"},
                        "member": {"type": ["string", "null"]},
                        "span": {
                            "oneOf": [
                                {"type": "null"},
                                {
                                    "type": "object",
                                    "required": ["startLine", "startCol",
                                                 "endLine", "endCol"],
                                    "additionalProperties": False,
                                    "properties": {
                                        "startLine": {"type": "integer"},
                                        "startCol": {"type": "integer"},
                                        "endLine": {"type": "integer"},
                                        "endCol": {"type": "integer"},
                                    },
                                },
                            ]
                        },
                    },
                },
            ]
        }
    },
}


def _location_json(loc) -> dict | None:
    if loc is None:
        return None
    span = None
    if loc.span is not None:
        span = {"startLine": loc.span.start_line,
                "startCol": loc.span.start_col,
                "endLine": loc.span.end_line,
                "endCol": loc.span.end_col}
    return {"class": loc.class_name, "member": loc.member, "span": span}


def report_to_json(report: Report,
                   suggestions: dict[str, CorrectionSet]) -> dict:
    options = {
        "nameMode": report.options.name_mode,
        "renameThreshold": report.options.rename_threshold,
        "inferCodeRelationships": report.options.infer_code_relationships,
        "typeEquivalences": sorted(sorted(pair)
                                   for pair in report.options.type_table),
    }
    findings = []
    for f in report.findings:
        s = suggestions.get(f.id)
        findings.append({
            "id": f.id,
            "kind": f.kind.value,
            "severity": f.severity,
            "modelLocation": _location_json(f.model_loc),
            "codeLocation": _location_json(f.code_loc),
            "detail": f.detail,
            "suggestions": [
                {"side": alt.side, "editKind": alt.kind,
                 "description": alt.description}
                for alt in (s.alternatives if s else ())],
        })
    return {
        "version": report.schema_version,
        "inputs": [{"path": d.path, "sha256": d.sha256}
                   for d in report.inputs],
        "options": options,
        "findings": findings,
    }


def _span_ref(loc) -> str:
    if loc is None or loc.span is None:
        return ""
    return f"{loc.span.artifact}:{loc.span.start_line}"


def format_report_text(report: Report,
                       suggestions: dict[str, CorrectionSet]) -> str:
    errors = report.error_findings()
    advisories = [f for f in report.findings if f.severity == "advisory"]
    lines: list[str] = []
    if not report.findings:
        lines.append("Design model and code are structurally consistent.")
        return "\n".join(lines) + "\n"
    summary = f"{len(errors)} inconsistenc" + \
        ("y" if len(errors) == 1 else "ies")
    if advisories:
        summary += f", {len(advisories)} advisory note(s)"
    lines.append(f"Found {summary}:")
    for i, f in enumerate(report.findings, 1):
        tag = " (advisory)" if f.severity == "advisory" else ""
        lines.append(f"\n{i}. {f.detail}{tag}")
        refs = []
        if _span_ref(f.model_loc):
            refs.append(f"model {_span_ref(f.model_loc)}")
        if _span_ref(f.code_loc):
            refs.append(f"code {_span_ref(f.code_loc)}")
        if refs:
            lines.append(f"   at: {', '.join(refs)}")
        s = suggestions.get(f.id)
        if s:
            lines.append("   choose either correction:")
            for alt in s.alternatives:
                lines.append(f"     - [{alt.side}] {alt.description}")
    return "\n".join(lines) + "\n"


def _read_file(path: str) -> str:
    return Path(path).read_text(encoding="utf-8")


def _descriptor(path: str, text: str) -> InputDescriptor:
    return InputDescriptor(
        path, hashlib.sha256(text.encode("utf-8")).hexdigest())


def _match_options(cfg: Config, args) -> MatchOptions:
    name_mode = getattr(args, "name_mode", None) or cfg.name_mode
    threshold = getattr(args, "rename_threshold", None)
    if threshold is None:
        threshold = cfg.rename_threshold
    infer = bool(getattr(args, "infer_relationships", False))
    return MatchOptions(name_mode, threshold,
                        make_type_table(cfg.type_equivalences), infer)


def _checked_pair(args, cfg: Config):
    model_text = _read_file(args.model)
    code_text = _read_file(args.code)
    design = parse_plantuml(model_text, artifact=args.model).model
    code_doc = parse_code(code_text, artifact=args.code)
    opts = _match_options(cfg, args)
    report = check(
        design, code_doc.model, opts,
        inputs=(_descriptor(args.model, model_text),
                _descriptor(args.code, code_text)),
        model_fingerprint=fingerprint_text(render_plantuml(design)),
        code_fingerprint=fingerprint_text(code_doc.raw_text))
    return model_text, code_text, design, code_doc, report


def _print_report(report: Report, sets: list[CorrectionSet],
                  as_json: bool) -> None:
    suggestions = {s.finding_id: s for s in sets}
    if as_json:
        print(json.dumps(report_to_json(report, suggestions), indent=2))
    else:
        print(format_report_text(report, suggestions), end="")


def cmd_check(args) -> int:
    cfg = load_config(args.config)
    _, _, design, code_doc, report = _checked_pair(args, cfg)
    sets = propose(report, design, code_doc)
    _print_report(report, sets, args.json)
    return 1 if report.error_findings() else 0


def _ask(sets: list[CorrectionSet]) -> list[CorrectionEdit]:
    chosen: list[CorrectionEdit] = []
    for i, s in enumerate(sets, 1):
        print(f"\n[{i}/{len(sets)}] {s.detail}")
        for j, alt in enumerate(s.alternatives, 1):
            print(f"  {j}. [{alt.side}] {alt.description}")
        while True:
            try:
                answer = input(
                    f"Choose 1-{len(s.alternatives)} or s to skip: ")
            except EOFError:
                return chosen
            answer = answer.strip().lower()
            if answer == "s":
                break
            if answer.isdigit() and 1 <= int(answer) <= len(s.alternatives):
                chosen.append(s.alternatives[int(answer) - 1])
                break
    return chosen


def cmd_sync(args) -> int:
    cfg = load_config(args.config)
    model_text, code_text, design, code_doc, report = _checked_pair(args, cfg)
    sets = propose(report, design, code_doc)

    policy_name = args.policy or cfg.policy
    if policy_name == "ask":
        chosen = _ask(sets)
    else:
        chosen = resolve(sets, Policy(policy_name), cfg.preferred_side)

    if chosen:
        new_model, new_code = apply(design, code_doc, chosen)
        model_changed = any(e.side == "model" for e in chosen)
        out_model = render_plantuml(new_model) if model_changed \
            else model_text
        out_code = new_code
    else:
        new_model, out_model, out_code = design, model_text, code_text

    model_out, code_out = _output_paths(args)
    Path(model_out).parent.mkdir(parents=True, exist_ok=True)
    Path(code_out).parent.mkdir(parents=True, exist_ok=True)
    Path(model_out).write_text(out_model, encoding="utf-8")
    Path(code_out).write_text(out_code, encoding="utf-8")

    if chosen:
        print(f"applied {len(chosen)} correction(s):")
        for edit in chosen:
            print(f"  - [{edit.side}] {edit.description}")
    else:
        print("already synchronized; artifacts unchanged")
    print(f"wrote {model_out}")
    print(f"wrote {code_out}")

    opts = _match_options(cfg, args)
    re_design = parse_plantuml(out_model, artifact=model_out).model
    re_code = parse_code(out_code, artifact=code_out)
    re_report = check(re_design, re_code.model, opts)
    remaining = re_report.error_findings()
    if remaining:
        print(f"synchronization did not converge: "
              f"{len(remaining)} finding(s) remain", file=sys.stderr)
        for f in remaining:
            print(f"  - {f.detail}", file=sys.stderr)
        return 1
    return 0


def _output_paths(args) -> tuple[str, str]:
    if args.in_place:
        return args.model, args.code
    out_dir = Path(args.out_dir)
    return (str(out_dir / Path(args.model).name),
            str(out_dir / Path(args.code).name))


def cmd_render(args) -> int:
    load_config(args.config)
    doc = parse_plantuml(_read_file(args.model), artifact=args.model)
    print(render_plantuml(doc.model), end="")
    return 0


def cmd_extract(args) -> int:
    load_config(args.config)
    doc = parse_code(_read_file(args.code), artifact=args.code)
    print(render_plantuml(doc.model), end="")
    return 0


def cmd_gen_code(args) -> int:
    load_config(args.config)
    doc = parse_plantuml(_read_file(args.model), artifact=args.model)
    print(render_code_skeleton(doc.model), end="")
    return 0


def cmd_gen(args) -> int:
    cfg = load_config(args.config)
    requirements = _read_file(args.requirements)
    if args.transport == "fixtures":
        transport = FixtureTransport(args.fixtures_dir or cfg.fixtures_dir)
    else:
        transport = HttpTransport(cfg.llm_endpoint)

    out_dir = Path(args.out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    model_path = out_dir / "model.puml"
    code_path = out_dir / "code.py"

    notes = sys.stderr if args.json else sys.stdout
    design: ClassModel | None = None
    code_doc: CodeDocument | None = None
    if args.what in ("model", "both"):
        generated = llm_gen_model(requirements, transport, cfg.llm_model)
        model_text = render_plantuml(generated)
        model_path.write_text(model_text, encoding="utf-8")
        design = parse_plantuml(model_text, artifact=str(model_path)).model
        print(f"wrote {model_path}", file=notes)
    if args.what in ("code", "both"):
        code_text = llm_gen_code(requirements, transport, cfg.llm_model)
        code_path.write_text(code_text, encoding="utf-8")
        code_doc = parse_code(code_text, artifact=str(code_path))
        print(f"wrote {code_path}", file=notes)

    if args.what == "both":
        assert design is not None and code_doc is not None
        model_text = render_plantuml(design)
        opts = _match_options(cfg, args)
        report = check(
            design, code_doc.model, opts,
            inputs=(_descriptor(str(model_path), model_text),
                    _descriptor(str(code_path), code_doc.raw_text)),
            model_fingerprint=fingerprint_text(model_text),
            code_fingerprint=fingerprint_text(code_doc.raw_text))
        sets = propose(report, design, code_doc)
        _print_report(report, sets, args.json)
    return 0


def _add_common(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--config", default=None,
                        help="path to a key=value config file")


def _add_match_flags(parser: argparse.ArgumentParser) -> None:
    parser.add_argument("--name-mode", choices=("exact", "canonical"),
                        default=None, help="identifier matching mode")
    parser.add_argument("--rename-threshold", type=float, default=None,
                        help="relative edit-distance bound for renames")
    parser.add_argument("--infer-relationships", action="store_true",
                        help="emit advisory relationship findings")


def _build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="modelsync",
        description="Keep a PlantUML class model and code synchronized.")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("check", help="diff a model/code pair")
    p.add_argument("model")
    p.add_argument("code")
    p.add_argument("--json", action="store_true", help="emit a JSON report")
    _add_common(p)
    _add_match_flags(p)
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("sync", help="repair a model/code pair in one pass")
    p.add_argument("model")
    p.add_argument("code")
    p.add_argument("--policy",
                   choices=("model-wins", "code-wins", "union", "ask"),
                   default=None, help="which side's values win")
    target = p.add_mutually_exclusive_group(required=True)
    target.add_argument("--out-dir", help="write corrected artifacts here")
    target.add_argument("--in-place", action="store_true",
                        help="overwrite the input files")
    _add_common(p)
    _add_match_flags(p)
    p.set_defaults(func=cmd_sync)

    p = sub.add_parser("render", help="re-render a model canonically")
    p.add_argument("model")
    _add_common(p)
    p.set_defaults(func=cmd_render)

    p = sub.add_parser("extract", help="extract a model from code")
    p.add_argument("code")
    _add_common(p)
    p.set_defaults(func=cmd_extract)

    p = sub.add_parser("gen-code", help="generate a code skeleton from a model")
    p.add_argument("model")
    _add_common(p)
    p.set_defaults(func=cmd_gen_code)

    p = sub.add_parser("gen",
                       help="generate artifacts from requirements text")
    p.add_argument("requirements")
    p.add_argument("--what", choices=("model", "code", "both"),
                   default="both")
    p.add_argument("--transport", choices=("live", "fixtures"),
                   default="fixtures")
    p.add_argument("--out-dir", default=".")
    p.add_argument("--fixtures-dir", default=None,
                   help="override the configured fixtures directory")
    p.add_argument("--json", action="store_true")
    _add_common(p)
    _add_match_flags(p)
    p.set_defaults(func=cmd_gen)

    return parser


def main(argv: list[str] | None = None) -> int:
    args = _build_parser().parse_args(argv)
    try:
        return args.func(args)
    except ParseError as exc:
        print(f"parse error: {exc}", file=sys.stderr)
        return 2
    except (TransportError, NoBlockFoundError,
            GenerationUnparsableError) as exc:
        print(f"generation failed: {exc}", file=sys.stderr)
        return 4
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return 3
    except OSError as exc:
        print(f"i/o error: {exc}", file=sys.stderr)
        return 3
    except ModelSyncError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
