import csv
import os

import numpy as np
from flask import current_app


def format_value(value, digits=17):
    if value is None:
        return ''
    if isinstance(value, (bool, np.bool_)):
        return 'true' if value else 'false'
    if isinstance(value, (int, np.integer)):
        return str(int(value))
    if isinstance(value, (float, np.floating)):
        return '{:.{}g}'.format(float(value), digits)
    return str(value)


def metadata_lines(experiment):
    return [
        'sddekit {}'.format(current_app.config['VERSION']),
        'kind {}'.format(experiment.kind),
        'model {}'.format(experiment.model_id or '-'),
        'config_sha256 {}'.format(experiment.config_hash),
        'master_seed {}'.format(experiment.master_seed),
    ]


def write_csv(path, header, rows, metadata=(), digits=17):
    """Write ``#`` metadata lines, a header row and one line per row; UTF-8 with LF endings."""
    directory = os.path.dirname(path)
    if directory:
        os.makedirs(directory, exist_ok=True)
    with open(path, 'w', encoding='utf-8', newline='') as f:
        for line in metadata:
            f.write('# {}\n'.format(line))
        writer = csv.writer(f, lineterminator='\n')
        writer.writerow(header)
        count = 0
        for row in rows:
            writer.writerow([format_value(value, digits) for value in row])
            count += 1
    return count


def read_csv_body(path):
    """Everything after the metadata block; what determinism checks compare."""
    with open(path, encoding='utf-8') as f:
        return ''.join(line for line in f if not line.startswith('#'))
