int main() {
  int n, i, x, c;
  c = 0;
  scanf("%d", &n);
  for (i = 0; i < n; i++) {
    scanf("%d", &x);
    if (x % 2 == 0)
      c = c + 1;
  }
  printf("%d\n", c);
  return 0;
}
