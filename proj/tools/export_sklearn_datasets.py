"""Export UCI datasets that ship inside scikit-learn as plain CSVs
(numeric features, class label in the last column)."""
import csv
import pathlib
import sys

from sklearn import datasets

SOURCES = {
    'breast-cancer-wisconsin': datasets.load_breast_cancer,
    'wine': datasets.load_wine,
    'iris': datasets.load_iris,
}


def main(out_dir):
    out = pathlib.Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    for name, loader in SOURCES.items():
        bunch = loader()
        path = out / f'{name}.csv'
        with path.open('w', newline='') as fh:
            w = csv.writer(fh)
            w.writerow([f'f{i}' for i in range(bunch.data.shape[1])] + ['class'])
            for x, y in zip(bunch.data, bunch.target):
                w.writerow([repr(float(v)) for v in x] + [f'c{int(y)}'])
        print(name, bunch.data.shape, 'classes', len(set(bunch.target)))


if __name__ == '__main__':
    main(sys.argv[1] if len(sys.argv) > 1 else 'data')
