from mpmath import mp, mpf, quad, exp, sin, cosh, gamma, inf, matrix, det
mp.dps=50
W={'hermite':lambda x:x**2,'x4':lambda x:x**4,'x8':lambda x:x**8,'x2sin':lambda x:x**2+sin(x),'cosh':lambda x:cosh(x)}
def mom(name,k):
    Q=W[name]
    if name in('hermite','x4','x8'):
        m={'hermite':2,'x4':4,'x8':8}[name]
        return mpf(0) if k%2 else 2*gamma(mpf(k+1)/m)/m
    pts=[-40,-30,-20,-15,-10,-7,-5,-3,-2,-1,0,1,2,3,5,7,10,15,20,30,40] if name=='x2sin' else [-8,-6,-5,-4,-3,-2,-1,0,1,2,3,4,5,6,8]
    return quad(lambda x:x**k*exp(-Q(x)),pts,maxdegree=10)
out=open('moments.txt','w')
for name in W:
    ms=[mom(name,k) for k in range(40)]
    out.write(name+' '+' '.join(mp.nstr(v,30) for v in ms)+'\n')
    # hankel b_n for n<=13 (x4,x8)
    if name in ('x4','x8','x2sin','cosh'):
        D=[mpf(1)]
        for n in range(1,15):
            D.append(det(matrix([[ms[i+j] for j in range(n)] for i in range(n)])))
        bs=[D[n+1]*D[n-1]/D[n]**2 for n in range(1,14)]
        out.write(name+'_b '+' '.join(mp.nstr(v,25) for v in bs)+'\n')
out.flush()
