"""Regenerate the tic-tac-toe endgame dataset (958 boards) as an 18-column
one-hot CSV: for each cell, an x-indicator and an o-indicator."""
import csv
import sys

LINES = [(0, 1, 2), (3, 4, 5), (6, 7, 8), (0, 3, 6),
         (1, 4, 7), (2, 5, 8), (0, 4, 8), (2, 4, 6)]


def winner(board):
    for a, b, c in LINES:
        if board[a] != 'b' and board[a] == board[b] == board[c]:
            return board[a]
    return None


def endgames():
    seen = set()
    order = []

    def play(board, player):
        w = winner(board)
        if w is not None or 'b' not in board:
            key = ''.join(board)
            if key not in seen:
                seen.add(key)
                order.append(key)
            return
        for i in range(9):
            if board[i] == 'b':
                board[i] = player
                play(board, 'o' if player == 'x' else 'x')
                board[i] = 'b'

    play(['b'] * 9, 'x')
    return sorted(order)


def main(path):
    boards = endgames()
    with open(path, 'w', newline='') as fh:
        out = csv.writer(fh)
        header = []
        for i in range(9):
            header += [f'c{i}_x', f'c{i}_o']
        out.writerow(header + ['class'])
        for key in boards:
            row = []
            for ch in key:
                row += [int(ch == 'x'), int(ch == 'o')]
            label = 'positive' if winner(list(key)) == 'x' else 'negative'
            out.writerow(row + [label])
    print(len(boards), 'boards written to', path)


if __name__ == '__main__':
    main(sys.argv[1] if len(sys.argv) > 1 else 'tic-tac-toe.csv')
