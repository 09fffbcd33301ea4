int larger(int a, int b) {
  if (a > b)
    return a;
  return b;
}

int main() {
  int i, m, x;
  scanf("%d", &m);
  for (i = 1; i < 4; i++) {
    scanf("%d", &x);
    m = larger(m, x);
  }
  printf("%d\n", m);
  return 0;
}
