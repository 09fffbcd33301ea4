int main() {
  int i, n, s;
  s = 0;
  scanf("%d", &n);
  if (n == 0)
    return 0;
  for (i = 1; i < n; i++) {
    s = s + i;
  }
  printf("%d\n", s);
  return 0;
}
