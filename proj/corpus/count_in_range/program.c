bool inside(int x, int lo, int hi) {
  return x >= lo && x < hi;
}

int main() {
  int i, n, x, c;
  c = 0;
  scanf("%d", &n);
  for (i = 0; i < n; i++) {
    scanf("%d", &x);
    if (inside(x, 1, 5))
      c++;
  }
  printf("%d\n", c);
  return 0;
}
