# terminal tables summarizing result envelopes
import pandas as pd

from util.jobs import ResultEnvelope


def _flatten(prefix: str, value, rows: list) -> None:
    if isinstance(value, dict):
        for k, v in value.items():
            _flatten(f'{prefix}.{k}' if prefix else k, v, rows)
    elif isinstance(value, list) and len(value) > 8:
        rows.append((prefix, f'[{len(value)} values]'))
    else:
        rows.append((prefix, value))


def summary_table(envelope: ResultEnvelope) -> pd.DataFrame:
    """One row per scalar output and diagnostic; long arrays are abbreviated."""
    rows = []
    _flatten('', {'outputs': envelope.outputs, 'diagnostics': envelope.diagnostics}, rows)
    return pd.DataFrame(rows, columns=['field', 'value'])


def outcome_table(counts: dict) -> pd.DataFrame:
    """Counts of solver outcomes (cylinder experiment)."""
    return pd.DataFrame(sorted(counts.items()), columns=['status', 'seeds'])


def format_summary(envelope: ResultEnvelope) -> str:
    header = f'{envelope.command}  (inputs {envelope.inputs_hash[:12]}, version {envelope.version})'
    return header + '\n' + summary_table(envelope).to_string(index=False)
