"""JSON schema of the ``mine`` result document."""

RESULT_SCHEMA = {
    "$schema": "https://json-schema.org/draft/2020-12/schema",
    "type": "object",
    "required": ["manifest", "params", "patterns", "timings"],
    "properties": {
        "manifest": {
            "type": "object",
            "required": ["command", "parameters", "input_checksums", "tool_version", "phase_seconds"],
        },
        "params": {
            "type": "object",
            "required": ["radius_km", "min_prev", "max_size", "algorithm"],
            "properties": {
                "radius_km": {"type": "number", "minimum": 0},
                "min_prev": {"type": "number", "minimum": 0},
                "max_size": {"type": "integer", "minimum": 2},
                "algorithm": {"enum": ["enum-g", "enum-k", "extend", "oracle"]},
            },
        },
        "patterns": {
            "type": "array",
            "items": {
                "type": "object",
                "required": ["features", "size", "participation_index", "participation_ratios",
                             "row_instance_count"],
                "additionalProperties": False,
                "properties": {
                    "features": {"type": "array", "items": {"type": "string"}, "minItems": 1},
                    "size": {"type": "integer", "minimum": 1},
                    "participation_index": {"type": "number", "minimum": 0, "maximum": 1},
                    "participation_ratios": {
                        "type": "object",
                        "additionalProperties": {"type": "number", "minimum": 0, "maximum": 1},
                    },
                    "row_instance_count": {"type": "integer", "minimum": 0},
                    "instances": {"type": "array", "items": {"type": "array", "items": {"type": "string"}}},
                },
            },
        },
        "timings": {
            "type": "object",
            "required": ["per_size_seconds", "total_seconds"],
            "properties": {
                "per_size_seconds": {"type": "object", "additionalProperties": {"type": "number"}},
                "total_seconds": {"type": "number"},
            },
        },
    },
}
