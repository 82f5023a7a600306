import numpy as np
import pytest

from sddekit.main.helpers.csv_helpers import format_value, read_csv_body, write_csv


class TestFormatValue(object):

    @pytest.mark.parametrize('value, expected', [
        (None, ''),
        (True, 'true'),
        (np.bool_(False), 'false'),
        (3, '3'),
        (np.int64(4), '4'),
        (0.1, '0.10000000000000001'),
        (np.float64(2.5), '2.5'),
        ('holder', 'holder'),
    ])
    def test_formats(self, value, expected):
        assert format_value(value) == expected

    def test_digits(self):
        assert format_value(1 / 3, digits=4) == '0.3333'


class TestWriteCsv(object):

    def test_metadata_header_and_rows(self, tmpdir):
        path = str(tmpdir.join('nested', 'out.csv'))
        count = write_csv(path, ['t', 'x0'], iter([[0.0, 1.0], [0.5, None]]), metadata=['kind simulate'])

        assert count == 2
        with open(path, encoding='utf-8', newline='') as f:
            assert f.read() == '# kind simulate\nt,x0\n0,1\n0.5,\n'
        assert read_csv_body(path) == 't,x0\n0,1\n0.5,\n'
