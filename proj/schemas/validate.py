#!/usr/bin/env python3
"""Validate a toolkit JSON document against one of the shipped schemas.

Usage: validate.py SCHEMA_NAME FILE [FILE ...]
       validate.py --list

SCHEMA_NAME is a schema file in this directory, with or without the
.schema.json suffix (e.g. "report" or "report.schema.json").
Requires the jsonschema package.
"""

import json
import pathlib
import sys

HERE = pathlib.Path(__file__).resolve().parent


def load_schema(name: str) -> dict:
    stem = name.removesuffix(".schema.json").removesuffix(".json")
    path = HERE / f"{stem}.schema.json"
    if not path.exists():
        raise SystemExit(f"no such schema: {path.name}")
    return json.loads(path.read_text())


def main() -> int:
    if len(sys.argv) >= 2 and sys.argv[1] == "--list":
        for path in sorted(HERE.glob("*.schema.json")):
            print(path.name)
        return 0
    if len(sys.argv) < 3:
        print(__doc__.strip(), file=sys.stderr)
        return 2

    import jsonschema
    from referencing import Registry, Resource

    schema = load_schema(sys.argv[1])
    # Register every shipped schema so relative $ref between them resolves.
    registry = Registry()
    for path in HERE.glob("*.schema.json"):
        doc = json.loads(path.read_text())
        resource = Resource.from_contents(doc)
        registry = registry.with_resource(uri=path.name, resource=resource)
        registry = registry.with_resource(uri=doc.get("$id", path.name), resource=resource)

    validator = jsonschema.Draft202012Validator(schema, registry=registry)
    failures = 0
    for file_name in sys.argv[2:]:
        document = json.loads(pathlib.Path(file_name).read_text())
        errors = sorted(validator.iter_errors(document), key=lambda e: e.json_path)
        if errors:
            failures += 1
            print(f"{file_name}: INVALID")
            for err in errors:
                print(f"  {err.json_path}: {err.message}")
        else:
            print(f"{file_name}: ok")
    return 1 if failures else 0


if __name__ == "__main__":
    raise SystemExit(main())
