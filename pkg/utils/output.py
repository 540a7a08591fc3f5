"""
Écriture des rapports en CSV ou en JSON.

CSV: une ligne d'en-tête, séparateur virgule, fins de ligne '\\n'. Les agrégats
vont dans un fichier voisin <nom>_aggregate.csv.

JSON: un document par exécution
    {schema_version, command, config, rows, aggregates, checks, passed, exit_code}
avec des clés triées, pour des fichiers identiques octet par octet à
paramètres identiques.
"""

import json
import logging
import sys
from pathlib import Path
from typing import Any, List, Optional

import numpy as np
import pandas as pd

logger = logging.getLogger(__name__)


def _records(df: pd.DataFrame) -> List[dict]:
    """Enregistrements Python natifs; NaN devient None"""
    if df.empty:
        return []
    df = df.astype(object)
    return df.where(pd.notnull(df), None).to_dict(orient='records')


def _json_default(value: Any):
    if isinstance(value, np.generic):
        return value.item()
    if isinstance(value, Path):
        return str(value)
    raise TypeError(f"Valeur non sérialisable: {value!r}")


def report_document(report, schema_version: int) -> dict:
    return {
        'schema_version': schema_version,
        'command': report.command,
        'config': report.config,
        'rows': _records(report.rows),
        'aggregates': _records(report.aggregates),
        'checks': report.checks,
        'passed': report.passed,
        'exit_code': int(report.exit_code),
        'message': report.message,
    }


def dumps_json(document: dict) -> str:
    return json.dumps(document, sort_keys=True, indent=2, ensure_ascii=False,
                      default=_json_default, allow_nan=False) + '\n'


def aggregate_path(out: Path) -> Path:
    return out.with_name(f"{out.stem}_aggregate{out.suffix or '.csv'}")


def write_report(report, fmt: str, out: Optional[str], schema_version: int) -> List[Path]:
    """Écrit le rapport; sans chemin, les lignes vont sur la sortie standard"""
    written = []
    if fmt == 'json':
        text = dumps_json(report_document(report, schema_version))
        if out is None:
            sys.stdout.write(text)
        else:
            path = Path(out)
            path.write_text(text, encoding='utf-8')
            written.append(path)
    else:
        if out is None:
            report.rows.to_csv(sys.stdout, index=False, lineterminator='\n')
        else:
            path = Path(out)
            report.rows.to_csv(path, index=False, lineterminator='\n')
            written.append(path)
            if not report.aggregates.empty:
                sidecar = aggregate_path(path)
                report.aggregates.to_csv(sidecar, index=False, lineterminator='\n')
                written.append(sidecar)
    for path in written:
        logger.info(f"Rapport écrit: {path}")
    return written
